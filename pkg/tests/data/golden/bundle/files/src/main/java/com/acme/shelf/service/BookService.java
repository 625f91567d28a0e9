package com.acme.shelf.service;

import com.acme.shelf.model.Book;
import com.acme.shelf.repository.BookRepository;
import org.springframework.stereotype.Service;

import java.util.List;

@Service
public class BookService {

    private final BookRepository repository;

    public BookService(BookRepository repository) {
        this.repository = repository;
    }

    public List<Book> findAll() {
        return repository.findAll();
    }

    public Book findById(Long id) {
        return repository.findById(id).orElseThrow();
    }

    public boolean borrow(Long bookId) {
        Book book = findById(bookId);
        if (book.isAvailable()) {
            book.setAvailable(false);
            repository.save(book);
            return true;
        }
        return false;
    }
}
