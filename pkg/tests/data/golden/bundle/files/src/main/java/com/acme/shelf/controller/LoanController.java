package com.acme.shelf.controller;

import com.acme.shelf.service.BookService;
import org.springframework.web.bind.annotation.PostMapping;
import org.springframework.web.bind.annotation.PathVariable;
import org.springframework.web.bind.annotation.RestController;

@RestController
public class LoanController {

    private final BookService service;

    public LoanController(BookService service) {
        this.service = service;
    }

    @PostMapping("/loans/{bookId}")
    public boolean borrow(@PathVariable Long bookId) {
        return service.borrow(bookId);
    }
}
